import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunManifest',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(help_text='Subcommand name, e.g. minksum', max_length=32)),
                ('seed', models.IntegerField(blank=True, null=True)),
                ('config', models.JSONField(default=dict, help_text='Effective options and settings')),
                ('stage_times', models.JSONField(default=dict, help_text='Wall-clock seconds per stage')),
                ('output_files', models.JSONField(default=list)),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['created_at'], name='run_manifest_created_idx'), models.Index(fields=['command'], name='run_manifest_command_idx')],
            },
        ),
    ]
