"""Domain error hierarchy.

Every error the simulator raises on bad input or a degenerate state is a
``NeurashedError``. The class name is the error name shown to users, so keep
names stable. ``NeurashedError`` derives from ``ValueError`` so callers that
only care about invalid values can keep catching that.
"""


class NeurashedError(ValueError):
    @property
    def kind(self) -> str:
        return type(self).__name__


class GraphError(NeurashedError):
    pass


class MalformedDocument(GraphError):
    pass


class EdgeSkipsLevel(GraphError):
    pass


class ThresholdOutOfRange(GraphError):
    pass


class DuplicateNodeId(GraphError):
    pass


class NoClassNodes(GraphError):
    pass


class InvalidLevel(GraphError):
    pass


class UnknownNodeId(GraphError):
    pass


class InputNodeNotLevelOne(GraphError):
    pass


class EmptyBatch(GraphError):
    pass


class DynamicsError(NeurashedError):
    pass


class NonFiniteLogit(DynamicsError):
    pass


class EmptyDataset(DynamicsError):
    pass


class LabelOutOfRange(DynamicsError):
    pass


class StateOverflow(DynamicsError):
    pass


class InvalidConfig(DynamicsError):
    pass


class MetricsError(NeurashedError):
    pass


class NonPositiveSigma(MetricsError):
    pass


class LevelOutOfRange(MetricsError):
    pass


class ZeroDenominator(MetricsError):
    pass


class NonFiniteActivation(MetricsError):
    pass


class EmptyGroup(MetricsError):
    pass


class ExperimentError(NeurashedError):
    pass


class UnknownScenario(ExperimentError):
    pass


class ReportingError(NeurashedError):
    pass


class EmptySeries(ReportingError):
    pass


class OutputDirNotEmpty(ReportingError):
    pass


class OutputLocked(ReportingError):
    pass
