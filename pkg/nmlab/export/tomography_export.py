from nmlab import Session
from nmlab.export.json_export import write_json
from nmlab.file import write_counts, write_density_matrix, write_mubs
from nmlab.tomography import build_mubs_d4


class TomographyExport(object):

    def __init__(self):
        self.session = Session.get_instance()
        self.config = self.session.config

    def export(self, configuration):
        config = configuration['tomography']
        if not config['export']:
            return

        result = self.session.get_result('tomography')
        if result is None:
            return

        output_dir = self.session.output_dir()
        mle = result['mle']
        metadata = self.config.metadata()
        metadata['input'] = result['input']
        metadata['t'] = result['t']
        metadata['converged'] = mle.converged

        path = output_dir / 'rho_hat.csv'
        write_density_matrix(path, mle.rho, metadata)
        self.session.add_output(path, 'csv', 'Reconstructed density matrix')

        if config['counts']:
            path = output_dir / 'counts.csv'
            write_counts(path, result['counts'], self.config.metadata())
            self.session.add_output(path, 'csv', 'Simulated detection counts')
            path = output_dir / 'mubs.csv'
            write_mubs(path, build_mubs_d4(), self.config.metadata())
            self.session.add_output(path, 'csv', 'Measurement bases')

        path = output_dir / 'tomography.json'
        write_json(path, {
            'metadata': self.config.metadata(),
            'input': result['input'],
            't': result['t'],
            'shots_per_basis': result['counts'].shots_per_basis,
            'reps': self.config.reps,
            'converged': mle.converged,
            'iterations': mle.iterations,
            'log_likelihood': mle.log_likelihood,
            'fidelity': result['fidelity'],
            'statistics': result['statistics'],
        })
        self.session.add_output(path, 'json',
                                'Reconstruction with Monte-Carlo errors')
