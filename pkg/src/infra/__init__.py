# Infra package
