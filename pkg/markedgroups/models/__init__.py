"""
Models module for markedgroups: the computational engines
"""

from .errors import (
    AlphabetMismatchError,
    BudgetExceededError,
    FamilyInvariantError,
    HenselError,
    MarkedGroupsError,
    ParseError,
    PreconditionError,
)
from .verdicts import Verdict
from .words import Alphabet, Generator, Word
from .smallcancel import DehnSolver, RelatorFamily
from .graphprod import CommutationGraph, GPWord
from .coxeter import CoxeterMatrix, CoxWord
from .abels import AbelsMatrix, EigenData, PAdicApprox, ZInvP
from .thompson import CharacterPair, DyadicPL
from .indfam import FamilyHandle, SubgroupZd
from .chabauty import BasicOpenSet, FiniteQuotientCert, MarkedGroup

__all__ = [
    'AlphabetMismatchError',
    'BudgetExceededError',
    'FamilyInvariantError',
    'HenselError',
    'MarkedGroupsError',
    'ParseError',
    'PreconditionError',
    'Verdict',
    'Alphabet',
    'Generator',
    'Word',
    'DehnSolver',
    'RelatorFamily',
    'CommutationGraph',
    'GPWord',
    'CoxeterMatrix',
    'CoxWord',
    'AbelsMatrix',
    'EigenData',
    'PAdicApprox',
    'ZInvP',
    'CharacterPair',
    'DyadicPL',
    'FamilyHandle',
    'SubgroupZd',
    'BasicOpenSet',
    'FiniteQuotientCert',
    'MarkedGroup',
]
