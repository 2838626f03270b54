from __future__ import annotations

import os
import platform
import tempfile
from pathlib import Path, PurePath
from typing import List, Union

import numpy as np

try:
    import orjson as json
except ImportError as e:
    import json
try:
    import pandas as pd
except ImportError as e:
    pd = None

from ncavity.constants.OutputFormat import OutputFormat


def _to_builtin(value):
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


def case_tag(re: float, n: int) -> str:
    return f"Re{re:g}_N{n}"


class ResultWriter:
    def __init__(self, config: dict = None) -> None:
        """
        Owns the output directory and writes every artifact of a run
        :param config: Optional settings; "out_dir" selects the output directory
        """
        if config is None:
            config = {}

        if config.get("out_dir"):
            self.out_dir = PurePath(Path(config["out_dir"]))
        elif os.getenv("NCAVITY_OUT_DIR"):
            self.out_dir = PurePath(Path(os.getenv("NCAVITY_OUT_DIR")))
        else:
            self.out_dir = PurePath(
                Path(
                    "/tmp" if platform.system() == "Darwin" else tempfile.gettempdir()
                ),
                "ncavity",
            )

        # Ensures that the output directory exists
        Path(self.out_dir).mkdir(parents=True, exist_ok=True)

    def path(self, file_name: str) -> Path:
        return Path(self.out_dir).joinpath(file_name)

    def write_json(self, file_name: str, data: Union[dict, list]) -> Path:
        """
        Writes `data` as JSON, numpy values are converted to plain Python first
        :param file_name: Name of the file inside the output directory
        :param data: JSON serializable dict or list
        """
        json_str = json.dumps(_to_builtin(data))
        try:
            json_str = json_str.decode("utf-8")
        except (UnicodeDecodeError, AttributeError):
            pass
        file_path = self.path(file_name)
        with open(file_path, "w", encoding="utf-8") as fopen:
            fopen.write(json_str)
        return file_path

    def read_json(self, file_name: str) -> Union[dict, list]:
        with open(self.path(file_name), "r", encoding="utf-8") as fopen:
            return json.loads(fopen.read())

    def write_csv(self, file_name: str, data) -> Path:
        """
        :param data: DataFrame or list of dicts
        """
        if pd is None:
            raise ModuleNotFoundError("You must install pandas to use this feature.")
        df = data if isinstance(data, pd.DataFrame) else pd.DataFrame(_to_builtin(data))
        file_path = self.path(file_name)
        df.to_csv(file_path, index=False, float_format="%.10g")
        return file_path

    def write_table(self, stem: str, rows: List[dict], output_format: OutputFormat) -> Path:
        output_format = OutputFormat(output_format)
        if output_format == OutputFormat.JSON:
            return self.write_json(f"{stem}.json", rows)
        return self.write_csv(f"{stem}.csv", rows)

    def write_grid(self, file_name: str, x: np.ndarray, y: np.ndarray, values: np.ndarray) -> Path:
        """
        Writes (x, y, value) rows, the format external contour plotters read
        """
        if pd is None:
            raise ModuleNotFoundError("You must install pandas to use this feature.")
        df = pd.DataFrame(
            {
                "x": np.asarray(x).ravel(),
                "y": np.asarray(y).ravel(),
                "value": np.asarray(values).ravel(),
            }
        )
        file_path = self.path(file_name)
        df.to_csv(file_path, index=False, float_format="%.10g")
        return file_path
