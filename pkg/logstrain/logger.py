# logger.py
import logging
import os
import sys
from datetime import datetime
from typing import Optional, Union

LOGGER_NAME = 'logstrain'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class Logger:
    """logstrain 包级日志记录器

    控制台输出写到 stderr（stdout 留给 JSON 报告），给出 log_dir 时另写一个带时间戳的日志文件。
    """

    def __init__(self, log_level: Union[int, str] = logging.INFO, log_dir: Optional[str] = None):
        if isinstance(log_level, str):
            log_level = logging.getLevelName(log_level.upper())
            if not isinstance(log_level, int):
                log_level = logging.INFO

        # 创建记录器
        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(log_level)
        self.log_file: Optional[str] = None

        # 避免重复处理程序
        if not self.logger.handlers:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
            self.logger.addHandler(console_handler)
        for handler in self.logger.handlers:
            handler.setLevel(log_level)

        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
            self.log_file = os.path.join(
                log_dir, f'logstrain_{datetime.now().strftime("%Y%m%d_%H%M%S")}.log')
            file_handler = logging.FileHandler(self.log_file, encoding='utf-8')
            file_handler.setLevel(log_level)
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
            self.logger.addHandler(file_handler)

    @property
    def level(self) -> int:
        return self.logger.level

    def close(self) -> None:
        """关闭并移除文件处理程序"""
        for handler in list(self.logger.handlers):
            if isinstance(handler, logging.FileHandler):
                handler.close()
                self.logger.removeHandler(handler)

    def debug(self, message):
        self.logger.debug(message)

    def info(self, message):
        self.logger.info(message)

    def warning(self, message):
        self.logger.warning(message)

    def error(self, message):
        self.logger.error(message)

    def critical(self, message):
        self.logger.critical(message)
