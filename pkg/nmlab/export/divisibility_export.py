from nmlab import Session
from nmlab.channels import Divisibility, is_non_markovian
from nmlab.export.json_export import write_json


class DivisibilityExport(object):

    def __init__(self):
        self.session = Session.get_instance()
        self.config = self.session.config

    def export(self, configuration):
        config = configuration['divisibility']
        if not config['export']:
            return

        table = self.session.get_result('divisibility')
        if table is None:
            return

        entries = [{
            's_time': entry.s_time,
            't_time': entry.t_time,
            'min_choi_eigenvalue': entry.min_choi_eigenvalue,
            'verdict': entry.verdict.value,
        } for entry in table]
        counts = {verdict.value: sum(1 for entry in table
                                     if entry.verdict is verdict)
                  for verdict in Divisibility}

        path = self.session.output_dir() / 'divisibility.json'
        write_json(path, {
            'metadata': self.config.metadata(),
            'entries': entries,
            'verdict_counts': counts,
            'non_markovian': is_non_markovian(table),
        })
        self.session.add_output(path, 'json',
                                'CP-divisibility of the intermediate maps')
