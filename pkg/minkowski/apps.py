from django.apps import AppConfig


class MinkowskiConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'minkowski'
