import os.path

from pkg_resources import DistributionNotFound, get_distribution

from .Benchmark import Benchmark, RunConfig
from .BoundaryLifting import BoundaryLifting, build_lifting
from .Cavity import Cavity, CavitySolution
from .Diagnostics import Diagnostics, DiagnosticsReport
from .PicardSolver import PicardConfig, PicardSolver, SolveReport, picard_solve
from .PressureField import PressureField
from .UniformMesh import UniformMesh, build_mesh
from .VelocityField import VelocityField

try:
    _dist = get_distribution("ncavity")
    # Normalize case for Windows systems
    dist_loc = os.path.normcase(_dist.location)
    here = os.path.normcase(__file__)
    if not here.startswith(os.path.join(dist_loc, "ncavity")):
        raise DistributionNotFound
except DistributionNotFound:
    __version__ = "Please install this project with setup.py"
else:
    __version__ = _dist.version
