"""
Pacote de Agentes
----------------
Este pacote contém o laboratório de bandits não estacionários: o ambiente
Gaussiano estacionário por partes, o agente TS-GE, os agentes de comparação
(TS clássico e M-UCB) e as ferramentas de análise, de estudo de caso SWIPT e
de execução de experimentos.
"""

__version__ = '0.1.0'

__all__ = ['__version__']
