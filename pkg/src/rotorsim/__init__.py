# -*- coding: utf-8 -*-

"""Modular rotorcraft flight dynamics: trim, linear models and autonomous ship landing."""
