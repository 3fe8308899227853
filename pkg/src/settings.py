"""
Configuration loader for the Vatican Designs Toolkit

Reads config.yaml, merges config.local.yaml (gitignored) over it and applies
environment overrides. Missing or broken files degrade to built-in defaults.
"""

import copy
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

ROOT = Path(__file__).parent.parent
NODE_BUDGET_ENV = "VATICAN_NODE_BUDGET"

DEFAULTS: Dict[str, Any] = {
    'groups': {
        'max_order': 10000,
        'table_max_order': 256,
    },
    'search': {
        'node_budget': 20000000,
        'max_order_pseudoterrace': 18,
        'max_order_tuples': 12,
        'conjugacy_max_order': 12,
        'max_witnesses': 1,
        'workers': 0,
    },
    'sweep': {
        'p_max_limit': 10000,
    },
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Merge override into base, recursing into nested sections"""
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value
    return base


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, 'r') as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        print(f"⚠️  Could not read {path.name}: {e}", file=sys.stderr)
        return {}
    if not isinstance(data, dict):
        print(f"⚠️  Ignoring {path.name}: top level is not a mapping", file=sys.stderr)
        return {}
    return data


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load the merged configuration

    Args:
        path: config file to use instead of <repo>/config.yaml

    Returns:
        Defaults, overlaid by config.yaml, config.local.yaml and environment
    """
    config = copy.deepcopy(DEFAULTS)

    config_path = Path(path) if path else ROOT / "config.yaml"
    if config_path.exists():
        _deep_merge(config, _read_yaml(config_path))

    local_path = config_path.parent / "config.local.yaml"
    if local_path.exists():
        _deep_merge(config, _read_yaml(local_path))

    budget = os.environ.get(NODE_BUDGET_ENV)
    if budget:
        try:
            config['search']['node_budget'] = int(budget)
        except ValueError:
            print(f"⚠️  Ignoring {NODE_BUDGET_ENV}={budget!r}: not an integer", file=sys.stderr)

    return config


def get(config: Dict[str, Any], dotted_key: str) -> Any:
    """Read a dotted key such as 'search.node_budget', falling back to the default"""
    for source in (config, DEFAULTS):
        node: Any = source
        for part in dotted_key.split('.'):
            if not isinstance(node, dict) or part not in node:
                node = None
                break
            node = node[part]
        if node is not None:
            return node
    raise KeyError(dotted_key)


def worker_count(config: Dict[str, Any], requested: Optional[int] = None) -> int:
    """Resolve a worker count; 0 or None means all available cores"""
    workers = requested if requested is not None else get(config, 'search.workers')
    if not workers or workers < 1:
        return os.cpu_count() or 1
    return int(workers)
