from nmlab import Session
from nmlab.export.json_export import write_json
from nmlab.file import write_table
from nmlab.image import write_cmyk_csv, write_ppm

READABILITY_HEADER = ['t', 'accuracy', 'mean_fidelity', 'tie_count']


class VaultExport(object):

    def __init__(self):
        self.session = Session.get_instance()
        self.config = self.session.config

    def export(self, configuration):
        config = configuration['vault']
        if not config['export']:
            return

        reports = self.session.get_result('vault')
        if not reports:
            return

        output_dir = self.session.output_dir()
        for stage, report in reports.items():
            metadata = self.config.metadata()
            metadata['stage'] = stage
            metadata['t'] = report.t

            if config['images']:
                path = output_dir / 'vault_{}.ppm'.format(stage)
                write_ppm(report.mixtures, path, metadata)
                self.session.add_output(
                    path, 'ppm', 'Measured image at the {} stage'.format(
                        stage))

            if config['mixtures']:
                path = output_dir / 'vault_{}_cmyk.csv'.format(stage)
                write_cmyk_csv(report.mixtures, path, metadata)
                self.session.add_output(
                    path, 'csv', 'CMYK weights at the {} stage'.format(stage))

        path = output_dir / 'vault_report.json'
        write_json(path, {
            'metadata': self.config.metadata(),
            'mode': self.config.mode,
            'register': not self.config.forget_register,
            'stages': {stage: report.summary()
                       for stage, report in reports.items()},
        })
        self.session.add_output(path, 'json', 'Decode reports')

        comparison = self.session.get_result('vault_compare')
        if comparison:
            path = output_dir / 'vault_compare.json'
            write_json(path, {
                'metadata': self.config.metadata(),
                'scenarios': {
                    key: {stage: report.summary()
                          for stage, report in stages.items()}
                    for key, stages in comparison.items()},
            })
            self.session.add_output(path, 'json',
                                    'Decode reports of several scenarios')

        curve = self.session.get_result('readability')
        if config['readability'] and curve is not None:
            path = output_dir / 'vault_readability.csv'
            write_table(path, READABILITY_HEADER,
                        zip(curve.t_grid, curve.accuracy,
                            curve.mean_fidelity, curve.tie_count),
                        self.config.metadata())
            self.session.add_output(path, 'csv',
                                    'Decode accuracy of the averaged image')
