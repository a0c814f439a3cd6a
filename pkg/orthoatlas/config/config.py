# python-decouple reads these from the environment or a .env file next to the project.

import os
from decouple import config

base_dir = os.path.dirname(os.path.realpath(__file__))


class Config:
    VERSION = "1.0.0"

    LOG_LEVEL = config("ATLAS_LOG_LEVEL", "WARNING")

    # workspace raster: N cells along rho, 2N along z
    GRID = config("ATLAS_GRID", 512, cast=int)
    # singular tracing: n theta3 samples, 4n theta2 samples
    TRACE = config("ATLAS_TRACE", 1024, cast=int)
    ASPECT_GRID = config("ATLAS_ASPECT_GRID", 256, cast=int)
    SWEEP_GRID = config("ATLAS_SWEEP_GRID", 256, cast=int)
    SWEEP_TRACE = config("ATLAS_SWEEP_TRACE", 512, cast=int)

    MIN_VOID_CELLS = config("ATLAS_MIN_VOID_CELLS", 4, cast=int)
    # relative margin added to the summed link lengths for the raster extent
    REACH_MARGIN = config("ATLAS_REACH_MARGIN", 0.02, cast=float)


class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = config("ATLAS_LOG_LEVEL", "DEBUG")


class TestingConfig(Config):
    TESTING = True
    TRACE = 512
    ASPECT_GRID = 128
    SWEEP_GRID = 96
    SWEEP_TRACE = 512


class ProductionConfig(Config):
    DEBUG = config("DEBUG", False, cast=bool)


config_dict = dict(
    dev=DevelopmentConfig,
    test=TestingConfig,
    prod=ProductionConfig
)
