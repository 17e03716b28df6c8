__all__ = ["settings", "utils"]
