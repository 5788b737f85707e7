"""Exception hierarchy. CLI exit codes are attached to the classes."""


class DiscwallError(Exception):
    exit_code = 1


class SceneError(DiscwallError):
    """Scene fails validation; message names the offending field or index."""

    exit_code = 2


class BasisError(DiscwallError):
    exit_code = 2


class GeometryError(DiscwallError):
    """A point or path hits a singularity or some other degenerate locus."""

    exit_code = 2


class DegenerateChargeError(DiscwallError):
    exit_code = 2


class InvalidWallError(DiscwallError):
    exit_code = 2


class WallAmbiguityError(DiscwallError):
    exit_code = 3

    def __init__(self, message, wall=None, point=None):
        super().__init__(message)
        self.wall = wall
        self.point = point


class UnsupportedClassError(DiscwallError):
    exit_code = 4
