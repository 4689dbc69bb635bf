class Base:
    """Value bound to the surface it lives on."""

    def __init__(self, surface):
        self.surface = surface


def lazy_property(prop):
    """Computes the wrapped attribute once and keeps it on the instance."""
    name = f"_lazy_{prop.__name__}"

    @property
    def wrapper(self):
        try:
            return object.__getattribute__(self, name)
        except AttributeError:
            value = prop(self)
            object.__setattr__(self, name, value)
            return value

    return wrapper
