from orthoatlas import create_cli
from orthoatlas.config.config import config_dict

cli = create_cli(config=config_dict["prod"])

if __name__ == "__main__":
    cli()
