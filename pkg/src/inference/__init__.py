# Empty __init__.py for inference package
