"""
Callbacks for monitoring and logging
"""
