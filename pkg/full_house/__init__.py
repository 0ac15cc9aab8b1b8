"""
full_house - Era-adjusted sports statistics from latent talent.

This package extracts latent talent scores from season-level statistics through
order-statistic transforms against an evolving eligible population, projects every
player into a common historical context, and validates the method by simulation.

Author: Ron Webb
Since: 1.0.0
"""

__version__ = "1.0.0"
