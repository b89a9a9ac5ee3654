# Utilitários compartilhados: configuração, logging, erros e persistência.
