"""
Core algorithms: field and code algebra, decoders, and the transformations between them
"""

from . import gf
from . import codealg
from . import decoder
from . import smooth
from . import fool
from . import goldberg
from . import twoquery
from . import linecode
from . import attack

__all__ = [
    'gf',
    'codealg',
    'decoder',
    'smooth',
    'fool',
    'goldberg',
    'twoquery',
    'linecode',
    'attack'
]
