"""
markedgroups
Desk-scale computational toolkit for marked groups, small cancellation
families and the concrete groups built from them
"""

__version__ = '1.0.0'
