"""Exception hierarchy shared by all modules."""


class Quartic28Error(Exception):
    """Base class for every error raised by the package."""


class ZeroVector(Quartic28Error):
    pass


class NoConvergence(Quartic28Error):
    pass


class RankDeficient(Quartic28Error):
    pass


class NotSmooth(Quartic28Error):
    pass


class CountMismatch(Quartic28Error):
    def __init__(self, count, message=None):
        self.count = count
        super().__init__(message or f"expected 28 bitangents, found {count}")


class TangentFailure(Quartic28Error):
    pass


class DegenerateChord(Quartic28Error):
    pass


class InconsistentPairing(Quartic28Error):
    pass


class TupleCountMismatch(Quartic28Error):
    def __init__(self, count, message=None):
        self.count = count
        super().__init__(message or f"expected 63 twelve-tuples, found {count}")


class ExcessIncidence(Quartic28Error):
    pass


class InconsistentStructure(Quartic28Error):
    pass


class PairingAmbiguous(Quartic28Error):
    pass


class PullbackAmbiguity(Quartic28Error):
    pass


class GeneralPositionFailure(Quartic28Error):
    pass


class NotAronhold(Quartic28Error):
    pass


class DegenerateConfiguration(Quartic28Error):
    pass
