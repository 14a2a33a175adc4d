# Empty __init__.py for evaluation package
