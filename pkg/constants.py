from enum import Enum, IntEnum

class ObstructionKind(str, Enum):
    NEIGHBORHOOD_DEGREE = "NeighborhoodDegree"  # loopless component, C[N(v)] has min degree < 2
    MIN_DEGREE_FOUR = "MinDegreeFour"  # loopless component with min degree < 4
    FORCE_LOOP = "ForceLoop"  # loopless edge without a common neighbor
    LOOP_DISTANCE = "LoopDistance"  # two looped vertices at distance >= 3
    FORCED_LOOPS = "ForcedLoops"  # induced path whose first edge is in no triangle lacks a loop
    NEGATIVE_PAIR_DEGREE = "NegativePairDegree"  # some w_ij < 0

class RejectReason(str, Enum):
    NEIGHBORHOOD_DEGREE = ObstructionKind.NEIGHBORHOOD_DEGREE.value
    MIN_DEGREE_FOUR = ObstructionKind.MIN_DEGREE_FOUR.value
    FORCE_LOOP = ObstructionKind.FORCE_LOOP.value
    LOOP_DISTANCE = ObstructionKind.LOOP_DISTANCE.value
    FORCED_LOOPS = ObstructionKind.FORCED_LOOPS.value
    NEGATIVE_PAIR_DEGREE = ObstructionKind.NEGATIVE_PAIR_DEGREE.value
    FILTERED = "Filtered"  # digraph outside the requested SearchFilter

    @classmethod
    def from_obstruction(cls, kind: ObstructionKind) -> "RejectReason":
        """Map a structural obstruction onto its reject reason"""
        return cls(kind.value)

class TriangleFreeFamily(IntEnum):
    NOT_GENERATING = 0
    SINGLE_LOOP = 1  # Fib
    EDGE_ONE_LOOP = 2  # PSU(3)_2
    EDGE_TWO_LOOPS_PLUS_ISOLATED = 3  # PSU(2)_6
    BOOLEAN_EMPTY = 4  # Rep(Z2^k), 2^k - 1 isolated loopless vertices

class OutputFormat(str, Enum):
    JSON = "json"
    TABLE = "table"
    LINES = "lines"

    @classmethod
    def choices(cls) -> list[str]:
        return [fmt.value for fmt in cls]

    @property
    def extension(self) -> str:
        return {"json": ".json", "table": ".txt", "lines": ".lines"}[self.value]

class ExitCode(IntEnum):
    OK = 0
    SEMANTIC_FAILURE = 1  # invalid ring, failed check
    USAGE = 2  # bad flags or malformed input
    RESOURCE_BOUND = 3  # rank or order beyond the configured bound
