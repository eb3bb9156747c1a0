# config.py
#
# Run configuration: configs/defaults.yaml, optionally overlaid with an extra
# yaml file, then with the command-line flags. The environment is never read.

import os

from omegaconf import DictConfig, OmegaConf

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")
DEFAULTS_FILE = os.path.join(CONFIG_DIR, "defaults.yaml")
ACCEPTANCE_FILE = os.path.join(CONFIG_DIR, "acceptance.yaml")


def get_cfg(extra_file=None) -> DictConfig:
    cfg = OmegaConf.load(DEFAULTS_FILE)
    if extra_file:
        cfg = OmegaConf.merge(cfg, OmegaConf.load(extra_file))
    return cfg


def get_acceptance_cfg(extra_file=None) -> DictConfig:
    cfg = OmegaConf.load(ACCEPTANCE_FILE)
    if extra_file:
        cfg = OmegaConf.merge(cfg, OmegaConf.load(extra_file))
    return cfg


def add_cli_config(cfg: DictConfig, args) -> DictConfig:
    """Flags that were given on the command line win over the yaml values."""
    if getattr(args, "format", None):
        cfg.output.format = args.format
    if getattr(args, "jobs", None) is not None:
        cfg.jobs = args.jobs
    if getattr(args, "max_n_override", None) is not None:
        cfg.engine.max_n = max(cfg.engine.max_n, args.max_n_override)
        cfg.scan.max_n = max(cfg.scan.max_n, args.max_n_override)
    if getattr(args, "sample_size", None) is not None:
        cfg.scan.sample_size = args.sample_size
    if getattr(args, "seed", None) is not None:
        cfg.scan.seed = args.seed
    return cfg
