from abc import ABC, abstractmethod

import pandas as pd


class ReportWriterPort(ABC):
    @abstractmethod
    def write_table(self, df: pd.DataFrame, path: str) -> str:
        """
        Writes a result table to the given path.
        Returns the absolute path of the written file.
        """
        pass

    @abstractmethod
    def write_text(self, text: str, path: str) -> str:
        """
        Writes a plain-text artifact (e.g. a plot script) to the given path.
        Returns the absolute path of the written file.
        """
        pass
