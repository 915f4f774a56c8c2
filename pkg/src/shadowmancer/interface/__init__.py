from .cli_interface import CLI, main

__all__ = ["CLI", "main"]
