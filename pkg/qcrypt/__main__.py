""" Entry point of the qcrypt command. """
import copy
import os
import sys

import yaml

import qcrypt.cli

CONFIG_PATH = "config.yml"
SEED_VAR = "QCRYPT_SEED"

DEFAULTS = {
    "seed": 1234,
    "sdp": {"tol": 1e-8},
    "uncertainty": {"restarts": 64, "tol": 1e-3},
    "output": {"format": "json", "precision": 7},
    "ot": {"trials": 1000},
}

def load_config(config_file):
    """
    Read the YAML config and merge it section by section over DEFAULTS. A missing file
    gives the defaults; QCRYPT_SEED overrides the seed.
    """
    conf = copy.deepcopy(DEFAULTS)
    if os.path.exists(config_file):
        with open(config_file) as f:
            loaded = yaml.safe_load(f) or {}
        for key, value in loaded.items():
            if isinstance(value, dict) and isinstance(conf.get(key), dict):
                conf[key].update(value)
            else:
                conf[key] = value
    if os.environ.get(SEED_VAR):
        conf["seed"] = int(os.environ[SEED_VAR])
    return conf

def main():
    qcrypt.cli.configure_logging()
    conf = load_config(CONFIG_PATH)
    app = qcrypt.cli.Qcrypt(conf)
    sys.exit(app.run(sys.argv[1:]))

if __name__ == "__main__":
    main()
