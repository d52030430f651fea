"""
NIB Planner
Sequential planner for UAV-borne network-in-a-box fleets backhauled by a HAPS
"""

__version__ = "1.0.0"
