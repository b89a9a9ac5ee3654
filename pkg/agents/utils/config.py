"""
Utilitário de Configuração
-------------------------
Este módulo lida com o carregamento e o acesso às configurações do
laboratório a partir de arquivos YAML: os padrões em agents/config.yaml e
os arquivos de experimento (um por experimento), que são mesclados sobre
os padrões e validados em um ExperimentConfig.
"""

import copy
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import yaml

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger
from agents.utils.errors import ConfigError

logger = get_logger(__name__)

CONFIG_FILE_NAME = 'config.yaml'
AGENTS_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_CONFIG_PATH = os.path.join(AGENTS_DIR, CONFIG_FILE_NAME)

EXPERIMENT_KINDS = ('bound_comparison', 'regret_race', 'case_study', 'validation_suite')
SECTIONS = ('logging', 'env', 'tsge', 'mucb', 'swipt', 'analysis', 'race', 'validation', 'harness')

_config_cache: Optional[Dict[str, Any]] = None


def _read_yaml(config_path: str) -> Dict[str, Any]:
    with open(config_path, 'r', encoding='utf-8') as f:
        data = yaml.safe_load(f)
    return data if isinstance(data, dict) else {}


def load_config(config_path: str = DEFAULT_CONFIG_PATH) -> Dict[str, Any]:
    """
    Carrega o arquivo de configuração YAML padrão.

    Args:
        config_path (str): Caminho do arquivo. O padrão é 'config.yaml' no diretório 'agents'.

    Returns:
        Dict[str, Any]: As configurações. Retorna um dicionário vazio se o arquivo
                        não for encontrado ou houver um erro.
    """
    global _config_cache
    use_cache = config_path == DEFAULT_CONFIG_PATH
    if use_cache and _config_cache is not None:
        logger.debug("Retornando configuração do cache.")
        return _config_cache

    try:
        logger.debug(f"Tentando carregar configuração de: {config_path}")
        config_data = _read_yaml(config_path)
        if not config_data:
            logger.warning(f"Arquivo de configuração {config_path} está vazio ou não é YAML válido.")
        else:
            logger.info(f"Configuração carregada com sucesso de {config_path}")
    except FileNotFoundError:
        logger.error(f"Arquivo de configuração não encontrado em {config_path}. Retornando configuração vazia.")
        config_data = {}
    except yaml.YAMLError as e:
        logger.error(f"Erro ao fazer parse do arquivo YAML de configuração {config_path}: {e}. Retornando configuração vazia.")
        config_data = {}

    if use_cache:
        _config_cache = config_data
    return config_data


def clear_config_cache() -> None:
    """Descarta a configuração em cache (usado pelos testes)."""
    global _config_cache
    _config_cache = None


def get_setting(section: str, setting_name: str, default_value: Any = None,
                config: Optional[Dict[str, Any]] = None) -> Any:
    """
    Obtém um valor de uma seção da configuração.

    Args:
        section (str): Nome da seção (ex: 'env', 'tsge', 'harness').
        setting_name (str): Nome da chave dentro da seção.
        default_value (Any): Valor retornado se a chave não existir ou for nula.
        config (Optional[Dict[str, Any]]): Configuração já carregada.

    Returns:
        Any: O valor configurado ou o valor padrão.
    """
    if config is None:
        config = load_config()
    value = (config.get(section) or {}).get(setting_name)
    return default_value if value is None else value


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Mescla `override` sobre `base` recursivamente, sem alterar os originais."""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


@dataclass
class ExperimentConfig:
    """Configuração validada de um experimento."""
    kind: str
    env: Dict[str, Any] = field(default_factory=dict)
    tsge: Dict[str, Any] = field(default_factory=dict)
    mucb: Dict[str, Any] = field(default_factory=dict)
    swipt: Dict[str, Any] = field(default_factory=dict)
    analysis: Dict[str, Any] = field(default_factory=dict)
    race: Dict[str, Any] = field(default_factory=dict)
    validation: Dict[str, Any] = field(default_factory=dict)
    logging: Dict[str, Any] = field(default_factory=dict)
    replications: int = 1
    base_seed: int = 0
    output_dir: str = 'results'
    threads: int = 1
    source_path: Optional[str] = None

    def seed_for(self, replication: int) -> int:
        """Semente da replicação: base_seed + índice."""
        return int(self.base_seed) + int(replication)

    def as_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind,
            'env': self.env, 'tsge': self.tsge, 'mucb': self.mucb, 'swipt': self.swipt,
            'analysis': self.analysis, 'race': self.race, 'validation': self.validation,
            'logging': self.logging,
            'harness': {
                'replications': self.replications, 'base_seed': self.base_seed,
                'output_dir': self.output_dir, 'threads': self.threads,
            },
        }


def build_experiment_config(raw: Dict[str, Any], defaults: Optional[Dict[str, Any]] = None,
                            source_path: Optional[str] = None) -> ExperimentConfig:
    """
    Mescla um dicionário de experimento sobre os padrões e valida o resultado.

    Raises:
        ConfigError: Tipo de experimento desconhecido ou valores de harness inválidos.
    """
    if defaults is None:
        defaults = load_config()
    merged = deep_merge(defaults, raw or {})

    kind = merged.get('kind') or (merged.get('experiment') or {}).get('kind')
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f"Tipo de experimento inválido: {kind!r}. Esperado um de {EXPERIMENT_KINDS}.")

    harness = merged.get('harness') or {}
    try:
        replications = int(harness.get('replications', 1))
        base_seed = int(harness.get('base_seed', 0))
        threads = int(harness.get('threads', 1))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Seção 'harness' com valor não inteiro: {e}") from e
    if replications < 1:
        raise ConfigError(f"replications deve ser >= 1 (recebido {replications}).")
    if threads < 1:
        raise ConfigError(f"threads deve ser >= 1 (recebido {threads}).")

    unknown = set(merged) - set(SECTIONS) - {'kind', 'experiment'}
    if unknown:
        logger.warning(f"Seções desconhecidas ignoradas no experimento: {sorted(unknown)}")

    return ExperimentConfig(
        kind=kind,
        env=dict(merged.get('env') or {}),
        tsge=dict(merged.get('tsge') or {}),
        mucb=dict(merged.get('mucb') or {}),
        swipt=dict(merged.get('swipt') or {}),
        analysis=dict(merged.get('analysis') or {}),
        race=dict(merged.get('race') or {}),
        validation=dict(merged.get('validation') or {}),
        logging=dict(merged.get('logging') or {}),
        replications=replications,
        base_seed=base_seed,
        output_dir=str(harness.get('output_dir', 'results')),
        threads=threads,
        source_path=source_path,
    )


def load_experiment_config(path: str, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Carrega um arquivo de experimento (YAML ou JSON) e aplica overrides de harness.

    Args:
        path (str): Caminho do arquivo de experimento.
        overrides (Optional[Dict[str, Any]]): Valores que substituem a seção 'harness'
                                              (base_seed, replications, output_dir, threads).

    Raises:
        ConfigError: Arquivo ausente, inválido ou com valores fora do domínio.
    """
    try:
        raw = _read_yaml(path)
    except FileNotFoundError as e:
        raise ConfigError(f"Arquivo de experimento não encontrado: {path}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Arquivo de experimento inválido {path}: {e}") from e
    if not raw:
        raise ConfigError(f"Arquivo de experimento vazio: {path}")

    if overrides:
        harness_overrides = {k: v for k, v in overrides.items() if v is not None}
        raw = deep_merge(raw, {'harness': harness_overrides})
    logger.info(f"Experimento carregado de {path}")
    return build_experiment_config(raw, source_path=path)


__all__ = [
    'load_config', 'clear_config_cache', 'get_setting', 'deep_merge',
    'ExperimentConfig', 'build_experiment_config', 'load_experiment_config', 'EXPERIMENT_KINDS',
]
