from .figures import FIGURE_IDS, render
from .reader import EXACT, FAILED, PlotsError, RunData, load_run, series

__version__ = "1.0.0"
