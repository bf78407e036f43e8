from ..schema import RunManifestData


class RunManifestMethods:
    """Methods and properties for RunManifest model"""

    @staticmethod
    def get_total_seconds(run):
        """Sum of all recorded stage times"""
        return float(sum(run.stage_times.values()))

    @staticmethod
    def get_file_count(run):
        return len(run.output_files)

    @staticmethod
    def to_data(run):
        """Wire representation, shared by the runs API and the manifest file"""
        return RunManifestData(
            id=run.id,
            command=run.command,
            seed=run.seed,
            config=run.config,
            stage_times=run.stage_times,
            output_files=run.output_files,
            failures=run.failures,
            created_at=run.created_at.isoformat(),
        )
