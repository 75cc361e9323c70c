from src.mountainpass.separation import (SeparationInputError,
                                         verify_separation)
from src.mountainpass.string import PassResult, PathState, find_mountain_pass

__all__ = ['PassResult', 'PathState', 'SeparationInputError',
           'find_mountain_pass', 'verify_separation']
