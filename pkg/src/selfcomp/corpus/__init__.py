"""Bundled example programs, golden traces, and the aspect baseline.

``read_features.bdl`` builds eight read features by derivation;
``ASPECT_FEATURES`` builds the same eight as flat before-advice aspects.
Golden traces for both live in ``golden_traces.json`` and were traced by
hand from the example programs, independently of this package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from ..analysis.aspects import Aspect, apply_before_advice
from ..analysis.growth import FeatureCost
from ..bdl import load
from ..behavior import Behavior, BehaviorStore, flatten_names
from ..registry import Registry, corpus_registry

FEATURES = (
    "User.getName",
    "User.getProfile",
    "User.getPosts",
    "User.getOnline",
    "Post.getRecentSummary",
    "Post.getRecentsWithoutImage",
    "Post.getPopularSummary",
    "Post.getPopularWithoutImage",
)
NO_AUTH_FEATURES = ("User.getOnline", "Post.getPopularSummary", "Post.getPopularWithoutImage")

ASPECTS = {
    "ReadUser": Aspect("ReadUser", ("logging", "auth", "cacheLookup", "userIdValidation")),
    "ReadUserWithoutAuth": Aspect("ReadUserWithoutAuth", ("logging", "cacheLookup", "userIdValidation")),
    "ReadPost": Aspect(
        "ReadPost", ("logging", "auth", "cacheLookup", "postNumberValidation", "rangeValidation")
    ),
    "ReadPostWithoutAuth": Aspect(
        "ReadPostWithoutAuth", ("logging", "cacheLookup", "postNumberValidation", "rangeValidation")
    ),
}

# feature -> (aspect, target)
ASPECT_FEATURES = {
    "User.getName": ("ReadUser", "readUserNameQuery"),
    "User.getProfile": ("ReadUser", "readUserProfileQuery"),
    "User.getPosts": ("ReadUser", "readUserPosts"),
    "User.getOnline": ("ReadUserWithoutAuth", "readUserOnline"),
    "Post.getRecentSummary": ("ReadPost", "ReadRecentsSummaryQuery"),
    "Post.getRecentsWithoutImage": ("ReadPost", "ReadRecentsSummaryWithoutImageQuery"),
    "Post.getPopularSummary": ("ReadPostWithoutAuth", "ReadPopularSummaryQuery"),
    "Post.getPopularWithoutImage": ("ReadPostWithoutAuth", "ReadPopularWithoutImageQuery"),
}

# With-auth twin of each no-auth aspect.
AUTHENTICATED_ASPECT = {"ReadUserWithoutAuth": "ReadUser", "ReadPostWithoutAuth": "ReadPost"}

# Coordination (a) and cross-cutting (b) SLOC over the eight features.
FEATURE_COSTS = {
    "aop": FeatureCost(coordination_sloc=26, crosscutting_sloc=18, feature_count=8),
    "self": FeatureCost(coordination_sloc=14, crosscutting_sloc=6, feature_count=8),
}


def corpus_dir() -> Path:
    return Path(str(resources.files(__name__)))


def read_text(filename: str) -> str:
    return (corpus_dir() / filename).read_text(encoding="utf-8")


def golden_traces() -> dict[str, dict[str, list[str]]]:
    return json.loads(read_text("golden_traces.json"))


def load_corpus(filename: str = "read_features.bdl", registry: Optional[Registry] = None) -> BehaviorStore:
    return load(read_text(filename), registry if registry is not None else corpus_registry())


def aspect_feature(feature: str, registry: Optional[Registry] = None, authenticated: bool = False) -> Behavior:
    aspect_name, target = ASPECT_FEATURES[feature]
    if authenticated:
        aspect_name = AUTHENTICATED_ASPECT.get(aspect_name, aspect_name)
    return apply_before_advice(ASPECTS[aspect_name], target, registry, name=f"aop.{feature}")


@dataclass(frozen=True)
class Check:
    feature: str
    expected: list[str]
    actual: list[str]

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def verify() -> list[Check]:
    """Compare every feature's flattened trace with its golden trace."""
    store = load_corpus()
    golden = golden_traces()["read_features"]
    return [Check(f, golden[f], flatten_names(store[f], store)) for f in FEATURES]
