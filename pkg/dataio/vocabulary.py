# dataio/vocabulary.py - Candidate factor names (fifty-two, source appendix order)

FACTOR_VOCABULARY = (
    'RVI', 'OBV', 'Hurst', 'ARBR', 'CCI20', 'CCI5', 'DEGM', 'BIAS20', 'BIAS5', 'REVS10',
    'ROA', 'ROE', 'RSI', 'TotalAssetGrowRate', 'TotalProfitCostRate', 'VOL120', 'VOL15',
    'NetProfitGrowRate', 'NPToTOR', 'OperatingProfitGrowRate', 'PB', 'PCF', 'PE', 'PS',
    'PSY', 'QuickRatio', 'HBETA', 'HSIGMA', 'LCAP', 'LFLO', 'MA5', 'MA20', 'EMA5', 'EMA20',
    'MLEV', 'NetAssetGrowRate', 'EPS', 'EquityToAsset', 'ETOP', 'FinancialExpenseRate',
    'GrossIncomeRatio', 'CTOP', 'CurrentAssetsRatio', 'CurrentRatio', 'DAVOL5',
    'DebtsAssetRatio', 'DilutedEPS', 'AccountsPayablesTRate', 'ARTRate', 'BLEV',
    'BondsPayableToAsset', 'CashToCurrentLiability',
)


def factor_names(count):
    """First `count` vocabulary names, continuing as F053, F054, ... past the vocabulary."""
    names = list(FACTOR_VOCABULARY[:count])
    names.extend(f"F{i + 1:03d}" for i in range(len(FACTOR_VOCABULARY), count))
    return names
