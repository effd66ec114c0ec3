# Calculations package
