"""
bayesgrain root module.
"""

import importlib.metadata


def get_bayesgrain_version() -> str:
    """
    Get the current bayesgrain version as a string using import.metadata.version
    """
    return importlib.metadata.version("bayesgrain")
