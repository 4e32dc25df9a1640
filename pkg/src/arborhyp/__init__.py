"""Hyperbolicity of generalized arborescent links via angled block decompositions."""
from .farey import GluingMap, Slope, as_slope, common_neighbors, farey_path, slope_reduce, wedge
from .presentation import Bracelet, LinkPresentation, Port, montesinos, pretzel, twobridge, validate
from .reducer import reduce
from .classifier import classify

__version__ = "0.1.0"
