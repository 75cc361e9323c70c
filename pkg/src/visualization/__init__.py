from src.visualization.export import (export_labeling, export_rows,
                                      labeling_frame, rows_frame, write_csv)

__all__ = ['export_labeling', 'export_rows', 'labeling_frame', 'rows_frame',
           'write_csv']
