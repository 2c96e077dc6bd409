"""Менеджер для структурированного хранения результатов расчета."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from ..utils.serialization import ArrayEncoder
from .gates4 import GateMatrix4, write_gate_csv

FLOAT_FORMAT = "%.17g"


class ArtifactStore:
    """Сохраняет таблицы, матрицы и JSON-дампы в одну выходную директорию."""

    def __init__(self, base_path: Path = Path("./pathint_output")):
        """
        Args:
            base_path: Выходная директория, создается при отсутствии
        """
        self.base_path = Path(base_path)
        self.base_path.mkdir(parents=True, exist_ok=True)
        self.logger = logging.getLogger(__name__)
        self.written: List[Path] = []

    def _target(self, name: str) -> Path:
        path = self.base_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def _record(self, path: Path) -> Path:
        self.written.append(path)
        self.logger.info(f"💾 Записан файл: {path}")
        return path

    def save_table(self, name: str, frame: pd.DataFrame, index: bool = False) -> Path:
        """
        Сохранить CSV-таблицу с 17 значащими цифрами.

        Args:
            name: Имя файла относительно base_path
            frame: Таблица для записи
            index: Записывать ли столбец индекса

        Returns:
            Путь к записанному файлу
        """
        path = self._target(name)
        frame.to_csv(path, index=index, float_format=FLOAT_FORMAT, lineterminator="\n")
        return self._record(path)

    def save_json(self, name: str, payload: Dict[str, Any]) -> Path:
        """Сохранить JSON; комплексные числа записываются парами [re, im]."""
        path = self._target(name)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, ensure_ascii=False, cls=ArrayEncoder)
            f.write("\n")
        return self._record(path)

    def save_gate(self, name: str, gate: GateMatrix4) -> Path:
        return self._record(write_gate_csv(gate, self._target(name)))

    def summary(self, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Сводка по уже записанным файлам."""
        summary = {
            "output_dir": str(self.base_path),
            "artifacts": [str(p.relative_to(self.base_path)) for p in self.written],
        }
        if extra:
            summary.update(extra)
        return summary
