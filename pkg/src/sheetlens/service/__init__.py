from sheetlens.service.app import app

__all__ = ["app"]
