from django.db import models
from django.utils import timezone


class RunManifest(models.Model):
    """A recorded command run: what ran, with which settings, and what it wrote"""
    command = models.CharField(max_length=32, help_text="Subcommand name, e.g. minksum")
    seed = models.IntegerField(blank=True, null=True)
    config = models.JSONField(default=dict, help_text="Effective options and settings")
    stage_times = models.JSONField(default=dict, help_text="Wall-clock seconds per stage")
    output_files = models.JSONField(default=list)
    failures = models.JSONField(default=list, help_text="Per-item errors the run skipped past")
    created_at = models.DateTimeField(default=timezone.now)

    class Meta:
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['created_at'], name='run_manifest_created_idx'),
            models.Index(fields=['command'], name='run_manifest_command_idx'),
        ]

    def __str__(self):
        return f"{self.command} run - {self.created_at.strftime('%B %d, %Y %H:%M')}"
