from .config import ParseError, RunConfig, UnknownKey, load_config, resolve
from .emit import Series, emit_csv, emit_svg
from .scenarios import RUNNERS, Scenario, replay, run_scenario
