"""
Closed verdict vocabulary shared by the engines and the reports
"""
from enum import Enum


class Verdict(str, Enum):
    OK = 'ok'
    VIOLATION = 'violation'
    DEPENDENT = 'dependent'
    TRIVIAL = 'trivial'
    NONTRIVIAL = 'nontrivial'
    MEMBER = 'member'
    NONMEMBER = 'nonmember'
    UNDETERMINED = 'undetermined'

    @classmethod
    def triviality(cls, trivial: bool) -> 'Verdict':
        return cls.TRIVIAL if trivial else cls.NONTRIVIAL

    @classmethod
    def membership(cls, member: bool) -> 'Verdict':
        return cls.MEMBER if member else cls.NONMEMBER

    @property
    def decided(self) -> bool:
        return self is not Verdict.UNDETERMINED
