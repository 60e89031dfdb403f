/* Trimmed PBCH simulator front end used by the explain fixtures. */
#include <stdio.h>
#include <stdlib.h>
#include <unistd.h>

#include "sim_common.h"

int main(int argc, char **argv) {
  double snr0 = -2.0, snr1 = 2.0, cfo = 0;
  int n_trials = 1, N_RB_DL = 273, Nid_cell = 0, pbch_phase = 0;
  int c;

  while ((c = getopt(argc, argv, "s:S:n:R:N:o:P::")) != -1) {
    switch (c) {
      case 's':
        snr0 = atof(optarg);
        break;

      case 'S':
        snr1 = atof(optarg);
        break;

      case 'n':
        n_trials = atoi(optarg);
        break;

      case 'R':
        N_RB_DL = atoi(optarg);
        break;

      case 'N':
        Nid_cell = atoi(optarg);
        break;

      case 'o':
        cfo = atof(optarg);
        printf("Setting CFO to %f Hz\n", cfo);
        break;

      case 'P':
        pbch_phase = optarg ? atoi(optarg) : 1;
        if (pbch_phase > 3)
          printf("Illegal PBCH phase (0-3) got %d\n", pbch_phase);
        break;

      default:
        usage(argv[0]);
        exit(-1);
    }
  }

  return run_pbch(snr0, snr1, n_trials, N_RB_DL, Nid_cell, cfo, pbch_phase);
}
