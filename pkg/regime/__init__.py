# regime - Box-Cox normalization and the Gaussian HMM market-state model
