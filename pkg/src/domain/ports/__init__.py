# Ports package
