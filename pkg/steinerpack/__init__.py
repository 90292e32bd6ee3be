from . import bench
from . import cli
from . import config
from . import errors
from . import families
from . import fn_ilp
from . import formats
from . import fracture
from . import graph
from . import ilp
from . import instances
from . import parameters
from . import reductions
from .solvers import dispatch
from .solvers import fracture_ilp
from .solvers import oracle
from .solvers import solver
from .solvers import tw_dp
from . import thin_rules
from . import tree_cut
from . import tree_decomposition
from ._version import __version__

__all__ = [
    "__version__",
    "bench",
    "cli",
    "config",
    "dispatch",
    "errors",
    "families",
    "fn_ilp",
    "formats",
    "fracture",
    "fracture_ilp",
    "graph",
    "ilp",
    "instances",
    "oracle",
    "parameters",
    "reductions",
    "solver",
    "thin_rules",
    "tree_cut",
    "tree_decomposition",
    "tw_dp",
]
