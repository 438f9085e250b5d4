from nmlab import Session
from nmlab.export.json_export import write_json
from nmlab.file import write_table

CURVE_HEADER = ['t', 'value_bits']
ENVELOPE_HEADER = ['t', 'lower_bits', 'upper_bits']


class CapacityExport(object):

    def __init__(self):
        self.session = Session.get_instance()
        self.config = self.session.config

    def export(self, configuration):
        config = configuration['capacities']
        if not config['export']:
            return

        curves = self.session.get_result('capacities')
        if not curves:
            return

        output_dir = self.session.output_dir()
        summaries = []
        for kind, curve in curves.items():
            metadata = self.config.metadata()
            metadata['kind'] = kind
            metadata['input'] = curve.input_descriptor
            path = output_dir / 'capacity_{}.csv'.format(kind)
            write_table(path, CURVE_HEADER,
                        zip(curve.t_grid, curve.values), metadata)
            self.session.add_output(
                path, 'csv', '{} of {} along t'.format(
                    kind, curve.input_descriptor))
            summaries.append(curve.summary())

        envelopes = self.session.get_result('envelopes')
        if config['envelopes'] and envelopes:
            for kind, (lower, upper) in envelopes.items():
                metadata = self.config.metadata()
                metadata['kind'] = kind
                metadata['samples'] = self.config.envelope
                path = output_dir / 'envelope_{}.csv'.format(kind)
                write_table(path, ENVELOPE_HEADER,
                            zip(lower.t_grid, lower.values, upper.values),
                            metadata)
                self.session.add_output(
                    path, 'csv',
                    '{} envelope over {} random states'.format(
                        kind, self.config.envelope))

        path = output_dir / 'capacities.json'
        write_json(path, {
            'metadata': self.config.metadata(),
            'curves': summaries,
        })
        self.session.add_output(path, 'json', 'Capacity summary')
