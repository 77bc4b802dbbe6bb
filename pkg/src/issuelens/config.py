"""Run configuration: defaults, overridden by a TOML file, overridden by flags."""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .discussions import MiningConfig
from .lints import RULES, RuleConfig
from .textprep import DEFAULT_OVERLONG_LIMIT


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class LintSettings:
    rules: RuleConfig = RuleConfig()
    all_issues: bool = False
    hypernym_lexicon: str | None = None  # TSV from scripts/build_hypernym_lexicon.py
    tag_sidecar: str | None = None  # pre-tagged sentences, see annotate.sidecar


@dataclass(frozen=True)
class EvolveSettings:
    sample_size: int | None = None  # per tracker; None keeps every issue
    sentiment_lexicon: str | None = None
    overlong_limit: int = DEFAULT_OVERLONG_LIMIT


@dataclass(frozen=True)
class LinkSettings:
    provider: str = "tfidf"
    embeddings: str | None = None
    year: int | None = None
    fit_scope: str = "linked"
    stop_words: tuple[str, ...] = ()


@dataclass(frozen=True)
class RunConfig:
    input: str | None = None
    out: str = "out"
    seed: int = 42
    tracker: str | None = None
    strict: bool = False
    lint: LintSettings = field(default_factory=LintSettings)
    evolve: EvolveSettings = field(default_factory=EvolveSettings)
    discuss: MiningConfig = field(default_factory=MiningConfig)
    links: LinkSettings = field(default_factory=LinkSettings)

    def echo(self) -> dict[str, Any]:
        """Plain-data copy for reports."""
        return _plain(dataclasses.asdict(self))


def _plain(value):
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


_TOP = {"input", "out", "seed", "tracker", "strict"}
_SECTIONS = ("lint", "evolve", "discuss", "links")
_RULE_FIELDS = {f.name for f in dataclasses.fields(RuleConfig)}


def _typed(section: str, key: str, value, expected):
    ok = {
        bool: isinstance(value, bool),
        int: isinstance(value, int) and not isinstance(value, bool),
        str: isinstance(value, str),
        list: isinstance(value, list) and all(isinstance(v, str) for v in value),
    }[expected]
    if not ok:
        raise ConfigError(f"[{section}] {key}: expected {expected.__name__}, got {value!r}")
    return value


def _build(cls, section: str, table: dict, overrides: dict | None = None):
    """Instantiate ``cls`` from a TOML table, checking names and primitive types."""
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name not in table:
            continue
        value = table[f.name]
        default = getattr(cls(), f.name)
        if isinstance(default, bool):
            value = _typed(section, f.name, value, bool)
        elif isinstance(default, int):
            value = _typed(section, f.name, value, int)
        elif isinstance(default, (frozenset, tuple)):
            value = type(default)(_typed(section, f.name, value, list))
        elif value is not None and f.type in ("str | None", "str"):
            value = _typed(section, f.name, value, str)
        elif f.type == "int | None" and value is not None:
            value = _typed(section, f.name, value, int)
        kwargs[f.name] = value
    kwargs.update(overrides or {})
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}] {exc}") from None


def config_from_mapping(data: dict) -> RunConfig:
    unknown = set(data) - _TOP - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    for name in _SECTIONS:
        if not isinstance(data.get(name, {}), dict):
            raise ConfigError(f"[{name}] must be a table")
    lint_table = dict(data.get("lint", {}))
    rule_table = {k: lint_table.pop(k) for k in list(lint_table) if k in _RULE_FIELDS}
    if "enabled_rules" in rule_table:
        _typed("lint", "enabled_rules", rule_table["enabled_rules"], list)
    for name, table, cls in (("lint", lint_table, LintSettings),
                             ("evolve", data.get("evolve", {}), EvolveSettings),
                             ("discuss", data.get("discuss", {}), MiningConfig),
                             ("links", data.get("links", {}), LinkSettings)):
        extra = set(table) - {f.name for f in dataclasses.fields(cls)}
        if extra:
            raise ConfigError(f"[{name}] unknown keys: {sorted(extra)}")
    rules = _build(RuleConfig, "lint", rule_table)
    top = {}
    for key in ("input", "out", "tracker"):
        if key in data:
            top[key] = _typed("top", key, data[key], str)
    if "seed" in data:
        top["seed"] = _typed("top", "seed", data["seed"], int)
    if "strict" in data:
        top["strict"] = _typed("top", "strict", data["strict"], bool)
    return RunConfig(
        **top,
        lint=_build(LintSettings, "lint", {k: v for k, v in lint_table.items()}, {"rules": rules}),
        evolve=_build(EvolveSettings, "evolve", data.get("evolve", {})),
        discuss=_build(MiningConfig, "discuss", data.get("discuss", {})),
        links=_build(LinkSettings, "links", data.get("links", {})),
    )


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from None
    return config_from_mapping(data)


def with_rules(config: RunConfig, names: list[str]) -> RunConfig:
    unknown = set(names) - set(RULES)
    if unknown:
        raise ConfigError(f"unknown rules: {sorted(unknown)}; known: {', '.join(RULES)}")
    rules = dataclasses.replace(config.lint.rules, enabled_rules=frozenset(names))
    return dataclasses.replace(config, lint=dataclasses.replace(config.lint, rules=rules))
