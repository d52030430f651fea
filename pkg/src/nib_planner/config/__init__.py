"""
Configuration helpers: environment presets, runtime settings and stage names
"""
