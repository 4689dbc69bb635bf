from .api import Cache, Twistable
