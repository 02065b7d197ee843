"""Exception hierarchy. Every error carries its short name for CLI reporting."""


class HeisError(Exception):
    """Base class for all library errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NotHorizontal(HeisError):
    pass


class AtPole(HeisError):
    pass


class MixedType(HeisError):
    pass


class SingularPoint(HeisError):
    pass


class DegenerateBasis(HeisError):
    pass


class NearBlowup(HeisError):
    pass


class DomainExceeded(HeisError):
    pass


class AxisContact(HeisError):
    pass


class CharacteristicPoint(HeisError):
    pass


class NotImmersed(HeisError):
    pass


class BadK(HeisError):
    pass


class UnknownName(HeisError):
    pass


class VanishingV(HeisError):
    pass


class Cylinder(HeisError):
    pass


class CurveSpecError(HeisError):
    pass
