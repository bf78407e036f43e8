from django.contrib import admin
from .models import RunManifest
from .applications.model_methods import RunManifestMethods


@admin.register(RunManifest)
class RunManifestAdmin(admin.ModelAdmin):
    list_display = ['id', 'command', 'seed', 'get_total_seconds',
                    'get_file_count', 'created_at']
    list_filter = ['command', 'created_at']
    search_fields = ['command']
    readonly_fields = ['created_at']
    date_hierarchy = 'created_at'

    def get_total_seconds(self, obj):
        return f"{RunManifestMethods.get_total_seconds(obj):.3f}"
    get_total_seconds.short_description = 'Seconds'

    def get_file_count(self, obj):
        return RunManifestMethods.get_file_count(obj)
    get_file_count.short_description = 'Files'
