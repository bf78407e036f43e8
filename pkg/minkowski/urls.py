from django.urls import path
from . import views

app_name = 'minkowski'

urlpatterns = [
    path('api/about/', views.about_api, name='about_api'),
    path('api/minksum/', views.minksum_api, name='minksum_api'),
    path('api/validate/', views.validate_api, name='validate_api'),
    path('api/collide/', views.collide_api, name='collide_api'),
    path('api/runs/', views.runs_api, name='runs_api'),
]
