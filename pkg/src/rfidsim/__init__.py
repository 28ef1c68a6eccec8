"""RFID access-control simulator and analysis library.

Pipeline: RF link model -> tree-walking singulation -> TDMA reader network
-> deterministic simulation -> data-record logs -> identification and
attendance reports.  See the README for the scenario file format and CLI.
"""

from importlib import resources
from pathlib import Path

from .errors import ConfigurationError, FramingError, RecordParseError
from .identity import (
    AttendanceReport,
    Employee,
    EmployeeRegistry,
    Session,
    attendance_report,
    identify,
    load_registry,
    save_registry,
    sessions,
)
from .readernet import (
    OverlapGraph,
    ReaderConfig,
    ReaderMode,
    assign_slots,
    build_overlap_graph,
    dedup,
)
from .records import (
    Access,
    DataRecord,
    append_log,
    encode_record,
    load_log,
    parse_record,
)
from .rflink import (
    LinkParams,
    Medium,
    MediumKind,
    backscatter_detectable,
    can_power_tag,
    field_strength,
    read_range,
)
from .scenario import MovementSchedule, ScenarioConfig, canonical_scenario, load_scenario
from .simulation import RawRead, RunManifest, World, run
from .singulation import (
    QueryResponse,
    ResponseKind,
    SingulationStats,
    TagId,
    decode_with_check,
    encode_with_check,
    query_prefix,
    singulate,
)

__version__ = "0.1.0"


def data_path(name: str) -> Path:
    """Path of a bundled data file (table1.log, registry.csv, *.scenario)."""
    return Path(str(resources.files(__name__).joinpath("data", name)))
