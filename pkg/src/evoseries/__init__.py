# -*- coding: utf-8 -*-

"""
evoseries is a package for Taylor-in-time series of evolution equations
and for checking claimed exact solutions against them.

"""

__version__ = '0.1.0'

__title__ = 'evoseries'
__description__ = "Taylor-in-time series and exact-solution checks for evolution equations"
__license__ = 'MIT License'

from evoseries import modules
