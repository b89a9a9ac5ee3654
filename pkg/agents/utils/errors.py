"""
Hierarquia de Erros
-------------------
Exceções do laboratório. Erros de argumento e de domínio herdam de
ValueError para que chamadas numéricas continuem capturáveis com o
idioma padrão do Python.
"""

__all__ = ['TsgeError', 'ArgumentError', 'DomainError', 'ConfigError', 'TraceMismatchError']


class TsgeError(Exception):
    """Base de todos os erros do pacote."""


class ArgumentError(TsgeError, ValueError):
    """Argumento fora do domínio aceito pela operação (braço inválido, conjunto vazio, ...)."""


class DomainError(TsgeError, ValueError):
    """Entrada válida em tipo mas degenerada para a fórmula (limite vazio, divisão por zero)."""


class ConfigError(TsgeError):
    """Arquivo de experimento inválido ou incompleto."""


class TraceMismatchError(ArgumentError):
    """Trace de execução e log de mudanças não cobrem o mesmo intervalo de slots."""
