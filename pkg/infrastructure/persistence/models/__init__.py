# __init__.py
from .system_file_model import ControlModel, ControlTimeModel, SystemFileModel

__all__ = ["ControlModel", "ControlTimeModel", "SystemFileModel"]
