# Test package for calculations
