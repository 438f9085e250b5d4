# flake8: noqa: F401
from . import numerics
from . import states
from . import channels
from . import capacities
from . import tomography
from . import vault
from . import file
from . import image
from . import utils
from ._version import version as __version__
from .models import run_config
from .models import schedule

from .session import Session
