"""
Interface de Linha de Comando do Laboratório TS-GE
--------------------------------------------------
Executa um experimento descrito num arquivo YAML/JSON:

    python -m interface.cli run experiments/regret_race.yaml --replications 10 --threads 4

Códigos de saída: 0 em sucesso, 2 para erros de configuração ou de domínio
(com um JSON {"error", "message", "config"} em stderr) e 1 para falhas
inesperadas. Na suíte de validação, verificações reprovadas ficam
registradas em validation.json e no log, mas não alteram o código de saída.
"""

# ============================================================================
# Configuração do Ambiente e Imports
# ============================================================================

import argparse
import json
import os
import sys
from typing import Any, Dict, List, Optional

# Ajusta o Python path para incluir o diretório raiz do projeto
current_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(current_dir)
if project_root not in sys.path:
    sys.path.insert(0, project_root)

# Imports locais
from agents.utils.logger import get_logger
from agents.utils.errors import TsgeError
from agents.utils.config import load_experiment_config
from agents.utils.env_setup import setup_environment, environment_overrides
from agents.tools.experiments import run_experiment

# Configuração do logger
logger = get_logger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2

# ============================================================================
# Funções Auxiliares
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='tsge', description='Laboratório de bandits não estacionários TS-GE.')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='Executa um arquivo de experimento.')
    run.add_argument('config', help='Arquivo YAML/JSON do experimento.')
    run.add_argument('--seed', type=int, default=None, help='Semente base (sobrescreve harness.base_seed).')
    run.add_argument('--replications', type=int, default=None, help='Número de replicações.')
    run.add_argument('--out', default=None, help='Diretório de saída.')
    run.add_argument('--threads', type=int, default=None, help='Workers do pool de processos.')
    return parser


def harness_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Variáveis TSGE_* primeiro, depois os argumentos da linha de comando."""
    overrides = environment_overrides()
    cli = {'base_seed': args.seed, 'replications': args.replications, 'output_dir': args.out, 'threads': args.threads}
    overrides.update({k: v for k, v in cli.items() if v is not None})
    return overrides


def report_error(kind: str, message: str, config_path: Optional[str]) -> None:
    print(json.dumps({'error': kind, 'message': message, 'config': config_path}, ensure_ascii=False), file=sys.stderr)

# ============================================================================
# Funções Principais
# ============================================================================

def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_environment()
    try:
        cfg = load_experiment_config(args.config, harness_overrides(args))
        paths = run_experiment(cfg)
    except TsgeError as e:
        logger.error(f"Experimento interrompido ({type(e).__name__}): {e}")
        report_error(type(e).__name__, str(e), args.config)
        return EXIT_CONFIG
    except Exception as e:
        logger.exception(f"Falha inesperada ao executar {args.config}: {e}")
        report_error('UnexpectedError', str(e), args.config)
        return EXIT_UNEXPECTED

    for name, path in paths.items():
        logger.info(f"Arquivo gravado ({name}): {path}")
    return EXIT_OK


__all__ = ['build_parser', 'harness_overrides', 'main', 'EXIT_OK', 'EXIT_CONFIG', 'EXIT_UNEXPECTED']

if __name__ == '__main__':
    sys.exit(main())
