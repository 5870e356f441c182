# factors - Factor panel preprocessing, IC selection and PCA
