from .dataset_io import dumps_dataset, loads_dataset, read_dataset, write_dataset

__all__ = ["dumps_dataset", "loads_dataset", "read_dataset", "write_dataset"]
