"""g2_transition package."""
