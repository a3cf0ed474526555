"""Analysis options with defaults taken from settings."""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict

from ..config import settings
from .certificates import ComparisonMode


@dataclass(frozen=True)
class AnalysisOptions:
    grid_resolution: int = field(default_factory=lambda: settings.GRID_RESOLUTION)
    support_limit: int = field(default_factory=lambda: settings.SUPPORT_LIMIT)
    max_nodes: int = field(default_factory=lambda: settings.MAX_SEARCH_NODES)
    max_grid_profiles: int = field(default_factory=lambda: settings.MAX_GRID_PROFILES)
    threads: int = field(default_factory=lambda: settings.THREADS)
    mode: ComparisonMode = ComparisonMode.PER_POPULATION

    def caps(self) -> Dict[str, Any]:
        """The option values a report must carry to be reproducible."""
        caps = asdict(self)
        caps["mode"] = self.mode.value
        caps["max_players"] = settings.MAX_PLAYERS
        caps["max_actions"] = settings.MAX_ACTIONS
        return caps
