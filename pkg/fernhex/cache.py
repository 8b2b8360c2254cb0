from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Dict, Optional

from .lattice import TriRegion
from .metrics import get_metrics

logger = logging.getLogger(__name__)


class CountCache:
    """Exact counts keyed by region fingerprint, optionally persisted as JSON."""

    FILE_NAME = "counts.json"

    def __init__(self, storage_dir: Optional[str] = None, persist: bool = False):
        self.persist = persist and storage_dir is not None
        self.storage_dir = Path(storage_dir) if storage_dir else None
        self.counts: Dict[str, int] = {}
        self.hits = 0
        self.misses = 0
        if self.persist:
            self.storage_dir.mkdir(parents=True, exist_ok=True)
            self._load_persistent_state()

    def _load_persistent_state(self):
        """Load cached counts from disk"""
        state_file = self.storage_dir / self.FILE_NAME
        if not state_file.exists():
            return
        try:
            with open(state_file, "r", encoding="utf-8") as f:
                data = json.load(f)
            # counts are stored as decimal strings; they outgrow JSON doubles
            self.counts = {key: int(value) for key, value in data.get("counts", {}).items()}
            logger.info(f"Loaded {len(self.counts)} cached counts from {state_file}")
        except (OSError, ValueError) as e:
            logger.warning(f"Ignoring unreadable count cache {state_file}: {e}")

    def flush(self):
        """Save counts to disk"""
        if not self.persist:
            return
        state_file = self.storage_dir / self.FILE_NAME
        try:
            with open(state_file, "w", encoding="utf-8") as f:
                json.dump({"counts": {k: str(v) for k, v in sorted(self.counts.items())}}, f)
        except OSError as e:
            logger.warning(f"Could not save count cache to {state_file}: {e}")

    def get(self, region: TriRegion, engine: str) -> Optional[int]:
        value = self.counts.get(self._key(region, engine))
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        metrics = get_metrics()
        if metrics:
            metrics.record_cache(value is not None)
        return value

    def put(self, region: TriRegion, engine: str, value: int):
        self.counts[self._key(region, engine)] = value

    def get_stats(self) -> Dict[str, int]:
        """Get cache statistics"""
        return {
            "entries": len(self.counts),
            "hits": self.hits,
            "misses": self.misses,
        }

    @staticmethod
    def _key(region: TriRegion, engine: str) -> str:
        return f"{engine}:{region.fingerprint()}"
