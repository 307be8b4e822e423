from ._aoicap import *  # noqa: F401,F403
