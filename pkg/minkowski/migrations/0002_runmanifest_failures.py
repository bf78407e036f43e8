from django.db import migrations, models


class Migration(migrations.Migration):

    dependencies = [
        ('minkowski', '0001_initial'),
    ]

    operations = [
        migrations.AddField(
            model_name='runmanifest',
            name='failures',
            field=models.JSONField(default=list, help_text='Per-item errors the run skipped past'),
        ),
    ]
