import logging

from django.apps import AppConfig

logger = logging.getLogger(__name__)


class ProbmetConfig(AppConfig):
    name = "probmet"
    verbose_name = "Probabilistic metric spaces"

    def ready(self):
        from .registry import registry
        from .utils import get_setting

        for path in get_setting("TNORMS", []):
            tnorm = registry.register(path)
            logger.info("Registered t-norm", extra={"tnorm": tnorm.slug, "path": path})
