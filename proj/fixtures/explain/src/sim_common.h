#ifndef SIM_COMMON_H
#define SIM_COMMON_H

void usage(const char *prog);
int run_pbch(double snr0, double snr1, int n_trials, int n_rb_dl,
             int nid_cell, double cfo, int pbch_phase);

#endif
