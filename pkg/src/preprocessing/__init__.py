# Empty __init__.py for preprocessing package
