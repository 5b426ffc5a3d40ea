# Test __init__.py to make tests discoverable as a package
