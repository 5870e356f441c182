# Market/factor data loading, observables, calendar and synthetic markets
