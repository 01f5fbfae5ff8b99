name = "owd"
__version__ = "0.3"
