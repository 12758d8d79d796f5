"""hubfleet: seed-reproducible multi-robot task allocation simulator.

Agents fly out of fixed depot hubs to serve time-windowed tasks under
stochastic travel times.  Hubs only see tasks inside their sensing
radius, and only share commitments along a directed communication graph,
so sparse graphs produce duplicated effort that the policies here (IBR,
EDD, Hungarian, random) handle differently.
"""

from .comms import (
    CommGraph,
    information_group_number,
    information_groups,
    make_topology,
    parse_topology,
)
from .engine import TrialEngine, run_trial
from .experiments import SweepSpec, run_sweep, run_topology_study
from .information import LocalView, available_tasks, build_views, visible_tasks
from .metrics import TrialRecord, efficiency_ratio, fraction_late, read_csv, write_csv
from .policies import (
    AssignmentProfile,
    SuccessProbTable,
    edd_plan,
    hungarian_plan,
    ibr_plan,
    local_welfare,
    make_policy,
    marginal_utility,
    random_plan,
    success_probability,
)
from .stochastics import (
    DegenerateDist,
    EpanechnikovDist,
    SeededRng,
    epan_cdf,
    epan_from_mean,
    epan_sample,
)
from .world import (
    AgentMode,
    AgentState,
    ConfigError,
    Hub,
    ScenarioConfig,
    Task,
    TaskStatus,
    generate_initial_tasks,
    maybe_spawn_task,
    mean_travel_time,
)

__version__ = "0.1.0"
