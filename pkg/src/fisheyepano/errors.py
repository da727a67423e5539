"""Exception hierarchy shared by all modules."""


class FisheyePanoError(Exception):
    """Base class for toolkit errors."""


class InvalidArgumentError(FisheyePanoError, ValueError):
    """An argument violated a documented precondition."""


class UnsupportedConfigurationError(FisheyePanoError):
    """Requested parameter combination is outside the supported range."""


class OutOfCircleError(FisheyePanoError):
    """A pixel coordinate lies outside the fisheye image circle."""


class DegenerateBoxError(FisheyePanoError):
    """A box or quad collapsed to zero extent where that is not allowed."""


class HorizonError(FisheyePanoError):
    """A viewing ray is parallel to the ground plane; no intersection exists."""


class ConfigurationError(FisheyePanoError):
    """Required metadata (camera height, config entry) is missing or inconsistent."""
