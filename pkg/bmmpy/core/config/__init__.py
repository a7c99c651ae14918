from bmmpy.core.config.configuration import TOMLConfiguration
from bmmpy.core.config.variables import VariableLibrary

__all__ = ["TOMLConfiguration", "VariableLibrary"]
