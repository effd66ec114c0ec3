# Source package
