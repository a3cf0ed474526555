"""Configuration for prefstab analyses."""

import os

from dotenv import load_dotenv

load_dotenv()


class Settings:
    """Analysis settings, overridable through environment variables or a .env file."""
    # Concurrency
    THREADS = max(1, int(os.getenv("PREFSTAB_THREADS", "1")))

    # Logging
    LOG_LEVEL = os.getenv("PREFSTAB_LOG_LEVEL", "WARNING").upper()
    SHOW_PROGRESS = os.getenv("PREFSTAB_SHOW_PROGRESS", "False").lower() == "true"

    # Desk-scale caps
    MAX_PLAYERS = int(os.getenv("PREFSTAB_MAX_PLAYERS", "4"))
    MAX_ACTIONS = int(os.getenv("PREFSTAB_MAX_ACTIONS", "6"))
    MAX_SEARCH_NODES = int(os.getenv("PREFSTAB_MAX_SEARCH_NODES", "200000"))
    MAX_GRID_PROFILES = int(os.getenv("PREFSTAB_MAX_GRID_PROFILES", "20000"))

    # Analysis defaults
    GRID_RESOLUTION = int(os.getenv("PREFSTAB_GRID", "10"))
    SUPPORT_LIMIT = int(os.getenv("PREFSTAB_SUPPORT_LIMIT", "2"))

    # Dynamics
    DYNAMICS_PRECISION = int(os.getenv("PREFSTAB_DYNAMICS_PRECISION", "60"))

    # Reports
    REPORT_SCHEMA_VERSION = "1.0"


settings = Settings()
