"""Exception hierarchy shared by every module of the package."""


class QCorrError(ValueError):
    """Base class for all errors raised by ``qcorrelations``."""


class NonSquare(QCorrError):
    pass


class NonHermitian(QCorrError):
    pass


# alias used by state validation, where the wording reads better
NotHermitian = NonHermitian


class NegativeEigenvalue(QCorrError):
    pass


class NotPSD(QCorrError):
    pass


class TraceNotOne(QCorrError):
    pass


class DimMismatch(QCorrError):
    pass


class NotUnitary(QCorrError):
    pass


class GammaOutOfRange(QCorrError):
    pass


class RankOutOfRange(QCorrError):
    pass


class IncompleteMeasurement(QCorrError):
    pass


class UnsupportedDimension(QCorrError):
    pass


class NotConverged(QCorrError):
    """The relative-entropy-of-entanglement solver hit its iteration cap.

    The best iterate found so far is available as ``result`` (a
    :class:`~qcorrelations.entanglement.ReeResult`), so callers can still
    report the value together with its duality gap.
    """

    def __init__(self, result):
        self.result = result
        super().__init__(
            f"Frank-Wolfe stopped after {result.iterations} iterations "
            f"with gap {result.gap:.3e} (value {result.value:.6f} bits)"
        )
