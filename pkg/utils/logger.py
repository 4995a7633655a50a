import logging

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class Logger:
    """Reporter that prefixes every message with an id, e.g. the command or module in use."""

    def __init__(self, base_logger: logging.Logger, id: str):
        self.base_logger = base_logger
        self.id = id

    def log(self, level: int, msg: str, thrown: BaseException = None) -> None:
        self.base_logger.log(level, f"{self.id} - {msg}", exc_info=thrown)


def get_reporter(name: str, id: str = None) -> Logger:
    return Logger(logging.getLogger(name), id if id is not None else name.split(".")[-1])


def configure_logging(verbose: bool = False) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format=LOG_FORMAT)
