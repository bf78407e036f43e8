"""
URL configuration for minksum_be project.

The geometry API lives under /api/ (see minkowski/urls.py), recorded runs
are browsable in the admin, and Prometheus scrapes /metrics.
"""
from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('admin/', admin.site.urls),
    path('', include('minkowski.urls')),
    path('', include('django_prometheus.urls')),  # Prometheus metrics at /metrics
]
