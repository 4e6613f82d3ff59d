from .misc import logger, run_command, set_loglevel
from ..core.filters import dict_to_cli_args
