# flake8: noqa: F401
from .schedule import AVAILABLE_SCHEDULES, get_schedule
from .run_config import RunConfig
