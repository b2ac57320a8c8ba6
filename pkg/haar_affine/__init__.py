# Haar affine systems toolkit
