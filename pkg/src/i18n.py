"""
Internationalization (i18n) Module

Message catalogs for the command-line interface of the VRJP potential lab.
Supports en-US (English) and pt-BR (Brazilian Portuguese).
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

LOCALE_ENV = "VRJP_LOCALE"


class I18n:
    """
    Loads JSON catalogs from locales/<locale>/<module>.json and resolves
    dotted keys.
    """

    SUPPORTED_LOCALES = ["en-US", "pt-BR"]
    DEFAULT_LOCALE = "en-US"

    def __init__(self, locale: Optional[str] = None):
        """
        Initialize the catalog handler.

        Args:
            locale: Locale code. Falls back to $VRJP_LOCALE, then DEFAULT_LOCALE.
        """
        self.locale = locale or os.environ.get(LOCALE_ENV) or self.DEFAULT_LOCALE
        self._check(self.locale)
        self.locales_dir = Path(__file__).parent.parent / "locales"
        self.locale_dir = self.locales_dir / self.locale
        if not self.locale_dir.exists():
            raise FileNotFoundError(f"Locale directory not found: {self.locale_dir}")
        self._catalogs: Dict[str, Dict[str, Any]] = {}

    def _check(self, locale: str) -> None:
        if locale not in self.SUPPORTED_LOCALES:
            raise ValueError(
                f"Unsupported locale: {locale}. Supported: {', '.join(self.SUPPORTED_LOCALES)}"
            )

    def load_module(self, module_name: str) -> Dict[str, Any]:
        """
        Load (and cache) the catalog of one module.

        Args:
            module_name: Catalog name, e.g. 'cli'

        Returns:
            Nested dictionary of messages, empty if the file is missing
        """
        if module_name in self._catalogs:
            return self._catalogs[module_name]
        json_path = self.locale_dir / f"{module_name}.json"
        if not json_path.exists():
            logger.warning("Catalog not found: %s", json_path)
            return {}
        with open(json_path, "r", encoding="utf-8") as f:
            catalog = json.load(f)
        self._catalogs[module_name] = catalog
        return catalog

    def t(self, key: str, module: str = "cli", **kwargs) -> str:
        """
        Translate a dotted key, interpolating keyword arguments.

        Unknown keys come back unchanged.

        Example:
            >>> I18n("en-US").t("results.verdict", verdict="PASS", command="ward-check", summary="ok")
            'PASS ward-check: ok'
        """
        value: Any = self.load_module(module)
        for part in key.split("."):
            if not isinstance(value, dict) or part not in value:
                return key
            value = value[part]
        if not isinstance(value, str):
            return key
        if kwargs:
            try:
                return value.format(**kwargs)
            except KeyError:
                return value
        return value

    def set_locale(self, locale: str) -> None:
        """Switch locale and drop cached catalogs."""
        self._check(locale)
        self.locale = locale
        self.locale_dir = self.locales_dir / locale
        self._catalogs.clear()

    def get_available_locales(self) -> List[str]:
        """Supported locale codes."""
        return self.SUPPORTED_LOCALES.copy()

    def __repr__(self) -> str:
        """Return string representation."""
        return f"I18n(locale='{self.locale}')"


_global_i18n: Optional[I18n] = None


def get_i18n(locale: Optional[str] = None) -> I18n:
    """
    Get or create the shared instance.

    Args:
        locale: Replace the shared instance with this locale when given

    Returns:
        I18n instance
    """
    global _global_i18n
    if _global_i18n is None or locale is not None:
        _global_i18n = I18n(locale)
    return _global_i18n


def t(key: str, module: str = "cli", **kwargs) -> str:
    """Shorthand for get_i18n().t(...)."""
    return get_i18n().t(key, module, **kwargs)
